from django.core.files.base import ContentFile
from django.core.files.storage import FileSystemStorage

from circle_envelopes import app_settings


class ArtifactStorage(FileSystemStorage):
    """
    Local storage for CSV and SVG artifacts.
    Saving replaces an existing file of the same name, so repeated runs
    write to the same paths.
    """
    def __init__(self, location=None, base_url=None, *args, **kwargs):
        location = app_settings.OUTPUT_DIR if location is None else location
        super(ArtifactStorage, self).__init__(location, base_url, *args, **kwargs)

    def get_available_name(self, name, max_length=None):
        return name

    def _save(self, name, content):
        if self.exists(name):
            self.delete(name)
        return super(ArtifactStorage, self)._save(name, content)

    def write_text(self, name, text):
        """
        Saves text as UTF-8 and returns the absolute path of the artifact.
        """
        saved = self.save(name, ContentFile(text.encode('utf-8')))
        return self.path(saved)
